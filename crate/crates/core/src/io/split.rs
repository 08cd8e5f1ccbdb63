use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::IoError;
use crate::sequences::{Label, LabeledWindow};

/// Stratified train/test split. Each class is shuffled with `seed` and
/// `floor(class_size * test_fraction)` of it goes to test, adjusted so that
/// both sides hold at least one example of every class present. Output
/// preserves the input order within each side.
pub fn split(
    dataset: &[LabeledWindow],
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<LabeledWindow>, Vec<LabeledWindow>), IoError> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(IoError::BadSpec(format!("test fraction {test_fraction} is not in (0, 1)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut to_test = vec![false; dataset.len()];
    let mut classes = 0;
    for label in [Label::Noncoding, Label::Coding] {
        let mut members: Vec<usize> = (0..dataset.len()).filter(|&i| dataset[i].label == label).collect();
        if members.is_empty() {
            continue;
        }
        classes += 1;
        if members.len() < 2 {
            return Err(IoError::TooSmall(format!("class {label} has a single example")));
        }
        let n_test = ((members.len() as f64 * test_fraction).floor() as usize).clamp(1, members.len() - 1);
        members.shuffle(&mut rng);
        for &i in &members[..n_test] {
            to_test[i] = true;
        }
    }
    if classes < 2 {
        return Err(IoError::TooSmall("a split needs both classes".into()));
    }
    let (test, train): (Vec<_>, Vec<_>) = dataset.iter().cloned().zip(to_test).partition(|(_, t)| *t);
    Ok((train.into_iter().map(|(w, _)| w).collect(), test.into_iter().map(|(w, _)| w).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{Origin, Strand};

    fn dataset(n_coding: usize, n_non: usize) -> Vec<LabeledWindow> {
        let mk = |i: usize, label| {
            let origin = Origin { seq_id: format!("s{i}"), offset: 1, strand: Strand::Forward };
            LabeledWindow::new("ACG", label, origin).unwrap()
        };
        (0..n_coding).map(|i| mk(i, Label::Coding)).chain((0..n_non).map(|i| mk(n_coding + i, Label::Noncoding))).collect()
    }

    fn count(ws: &[LabeledWindow], label: Label) -> usize {
        ws.iter().filter(|w| w.label == label).count()
    }

    #[test]
    fn stratified_floor_allocation() {
        let (train, test) = split(&dataset(50, 50), 0.3, 1).unwrap();
        assert_eq!((train.len(), test.len()), (70, 30));
        assert_eq!((count(&train, Label::Coding), count(&train, Label::Noncoding)), (35, 35));
        assert_eq!((count(&test, Label::Coding), count(&test, Label::Noncoding)), (15, 15));
    }

    #[test]
    fn seeded_and_disjoint() {
        let data = dataset(20, 13);
        let a = split(&data, 0.25, 9).unwrap();
        assert_eq!(a, split(&data, 0.25, 9).unwrap());
        assert_ne!(a, split(&data, 0.25, 10).unwrap());
        let mut ids: Vec<_> = a.0.iter().chain(&a.1).map(|w| w.origin.seq_id.clone()).collect();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), 33);
    }

    #[test]
    fn small_classes_keep_one_per_side() {
        let (train, test) = split(&dataset(2, 10), 0.1, 0).unwrap();
        assert_eq!((count(&train, Label::Coding), count(&test, Label::Coding)), (1, 1));
        assert_eq!(count(&test, Label::Noncoding), 1);
    }

    #[test]
    fn too_small() {
        assert!(matches!(split(&dataset(0, 3), 0.3, 0), Err(IoError::TooSmall(_))));
        assert!(matches!(split(&dataset(1, 5), 0.3, 0), Err(IoError::TooSmall(_))));
        assert!(matches!(split(&dataset(5, 5), 1.0, 0), Err(IoError::BadSpec(_))));
    }
}
