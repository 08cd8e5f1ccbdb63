use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fmaca::experiment::{synthetic_benchmark, train_model, Algorithm, TrainOptions};
use fmaca::io::{load_model, save_model, Model};
use fmaca::learn::{GaConfig, TreeConfig};

fn random_windows(n: usize, len: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| (0..len).map(|_| b"ACGT"[rng.gen_range(0..4)] as char).collect()).collect()
}

#[test]
fn saved_tree_classifies_identically() {
    let (train, _, _) = synthetic_benchmark(54, 40, 1, 11).unwrap();
    let opts = TrainOptions {
        tree: TreeConfig { ga: GaConfig { population_size: 16, generations: 8, ..GaConfig::default() }, ..TreeConfig::default() },
        ..TrainOptions::default()
    };
    let file = train_model(Algorithm::Fmaca, &train, &opts).unwrap();
    assert!(matches!(file.model, Model::FmacaTree(_)));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tree.json");
    save_model(&file, &path).unwrap();
    let back = load_model(&path).unwrap();
    assert_eq!(back, file);
    for w in random_windows(1000, 54, 3) {
        assert_eq!(file.classify(&w).unwrap(), back.classify(&w).unwrap());
    }
}

#[test]
fn every_kind_round_trips() {
    let (train, test, _) = synthetic_benchmark(54, 30, 10, 2).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let opts = TrainOptions {
        tree: TreeConfig { ga: GaConfig { population_size: 8, generations: 3, ..GaConfig::default() }, ..TreeConfig::default() },
        encoding: fmaca::experiment::EncodingChoice::Codon,
    };
    for alg in Algorithm::ALL {
        let file = train_model(alg, &train, &opts).unwrap();
        let path = dir.path().join(format!("{alg}.json"));
        save_model(&file, &path).unwrap();
        let back = load_model(&path).unwrap();
        assert_eq!(back, file, "{alg}");
        let text = std::fs::read_to_string(&path).unwrap();
        save_model(&back, &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), text, "{alg} output not stable");
        for w in &test {
            assert_eq!(file.classify(&w.bases).unwrap(), back.classify(&w.bases).unwrap());
        }
    }
}
