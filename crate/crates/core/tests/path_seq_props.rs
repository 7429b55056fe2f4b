use hamcycle::{PathForest, PathSeq, Vertex};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const UNIVERSE: usize = 48;

#[derive(Debug, Clone)]
enum Op {
    Build(Vec<Vertex>),
    Split { path: usize, at: usize },
    Concat { left: usize, right: usize },
    Dissolve(usize),
    Query { path: usize, vertex: Vertex },
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        2 => proptest::sample::subsequence((0..UNIVERSE as Vertex).collect::<Vec<_>>(), 1..12)
            .prop_shuffle()
            .prop_map(Op::Build),
        3 => (any::<usize>(), any::<usize>()).prop_map(|(path, at)| Op::Split { path, at }),
        3 => (any::<usize>(), any::<usize>()).prop_map(|(left, right)| Op::Concat { left, right }),
        1 => any::<usize>().prop_map(Op::Dissolve),
        3 => (any::<usize>(), 0..UNIVERSE as Vertex).prop_map(|(path, vertex)| Op::Query { path, vertex }),
    ]
}

fn agree(forest: &PathForest, seq: &PathSeq, model: &[Vertex]) -> Result<(), TestCaseError> {
    prop_assert_eq!(forest.to_list(seq), model.to_vec());
    let reversed: Vec<Vertex> = model.iter().rev().copied().collect();
    prop_assert_eq!(forest.to_list_reversed(seq), reversed);
    prop_assert_eq!(seq.len(), model.len());
    forest.check_invariants(seq).map_err(TestCaseError::fail)?;
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn forest_matches_vectors(ops in proptest::collection::vec(op(), 1..120)) {
        let mut forest = PathForest::new(UNIVERSE);
        let mut paths: Vec<(PathSeq, Vec<Vertex>)> = Vec::new();
        for op in ops {
            match op {
                Op::Build(vertices) => {
                    let clash = vertices.iter().any(|&v| forest.is_attached(v));
                    match forest.from_sequence(&vertices) {
                        Ok(seq) => {
                            prop_assert!(!clash);
                            agree(&forest, &seq, &vertices)?;
                            paths.push((seq, vertices));
                        }
                        Err(_) => prop_assert!(clash),
                    }
                }
                Op::Split { path, at } if !paths.is_empty() => {
                    let count = paths.len();
                    let (seq, model) = &mut paths[path % count];
                    let at = at % model.len();
                    if at == 0 {
                        prop_assert!(forest.split_before(seq, model[0]).is_err());
                    } else {
                        let original = model.clone();
                        let tail = forest.split_before(seq, model[at]).unwrap();
                        let tail_model = model.split_off(at);
                        agree(&forest, seq, model)?;
                        agree(&forest, &tail, &tail_model)?;
                        // concatenating back restores the original order
                        forest.append(seq, tail);
                        agree(&forest, seq, &original)?;
                        *model = original;
                    }
                }
                Op::Concat { left, right } if paths.len() >= 2 => {
                    let (right, right_model) = paths.swap_remove(right % paths.len());
                    let (left, left_model) = paths.swap_remove(left % paths.len());
                    let expected_len = left_model.len() + right_model.len();
                    let joined = forest.concat(left, right);
                    let model: Vec<Vertex> = left_model.into_iter().chain(right_model).collect();
                    prop_assert_eq!(joined.len(), expected_len);
                    agree(&forest, &joined, &model)?;
                    paths.push((joined, model));
                }
                Op::Dissolve(i) if !paths.is_empty() => {
                    let (seq, model) = paths.swap_remove(i % paths.len());
                    forest.dissolve(seq);
                    prop_assert!(model.iter().all(|&v| !forest.is_attached(v)));
                }
                Op::Query { path, vertex } if !paths.is_empty() => {
                    let (seq, model) = &paths[path % paths.len()];
                    let pos = model.iter().position(|&v| v == vertex);
                    prop_assert_eq!(forest.contains(seq, vertex), pos.is_some());
                    if let Some(r) = pos {
                        prop_assert_eq!(forest.rank(seq, vertex).unwrap(), r + 1);
                        prop_assert_eq!(forest.pred(seq, vertex).unwrap(), r.checked_sub(1).map(|j| model[j]));
                        prop_assert_eq!(forest.succ(seq, vertex).unwrap(), model.get(r + 1).copied());
                        prop_assert_eq!(forest.half(seq, vertex).unwrap(), 2 * (r + 1) <= model.len() + 1);
                    } else {
                        prop_assert!(forest.rank(seq, vertex).is_err());
                    }
                }
                _ => {}
            }
            prop_assert_eq!(forest.live_paths(), paths.len());
        }
    }

    #[test]
    fn heights_are_logarithmic(len in 1usize..3000, cuts in proptest::collection::vec(any::<usize>(), 0..20)) {
        let mut forest = PathForest::new(len);
        let order: Vec<Vertex> = (0..len as Vertex).collect();
        let mut seq = forest.from_sequence(&order).unwrap();
        for c in cuts {
            if seq.len() < 2 {
                break;
            }
            let at = 1 + c % (seq.len() - 1);
            let v = forest.to_list(&seq)[at];
            let tail = forest.split_before(&mut seq, v).unwrap();
            seq = forest.concat(tail, seq);
            forest.check_invariants(&seq).map_err(TestCaseError::fail)?;
        }
        let bound = 1.45 * ((len + 2) as f64).log2();
        prop_assert!(forest.height(&seq) as f64 <= bound);
    }
}

/// Building from a permutation and reading it back is the identity.
#[test]
fn permutations_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut forest = PathForest::new(64);
    for _ in 0..100_000 {
        let len = rng.random_range(1..=64);
        let mut order: Vec<Vertex> = (0..64).collect();
        order.shuffle(&mut rng);
        order.truncate(len);
        let seq = forest.from_sequence(&order).unwrap();
        assert_eq!(forest.to_list(&seq), order);
        assert_eq!((seq.start(), seq.end()), (order[0], order[len - 1]));
        forest.dissolve(seq);
    }
}
