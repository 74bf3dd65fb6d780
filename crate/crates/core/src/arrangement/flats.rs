use std::collections::BTreeSet;

use super::Arrangement;
use crate::linalg::{FieldSpec, Matrix, Scalar};

/// A nonempty intersection of hyperplanes, recorded by the set of all hyperplanes containing it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Flat {
    pub codim: usize,
    pub hyperplanes: Vec<usize>,
}

fn augmented(arr: &Arrangement, set: &[usize]) -> Matrix {
    let rows: Vec<Vec<Scalar>> = set
        .iter()
        .map(|&i| {
            let h = &arr.hyperplanes()[i];
            let mut r = h.normal.clone();
            r.push(h.offset.clone());
            r
        })
        .collect();
    Matrix::from_rows(rows, arr.dim() + 1).expect("rows have ambient length plus one")
}

/// The intersection lattice, including the ambient space (empty hyperplane set).
/// Sorted by codimension, then by hyperplane set.
pub fn flats(arr: &Arrangement) -> Vec<Flat> {
    let q = FieldSpec::Rationals;
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(Vec::new());
    let mut frontier = vec![Vec::<usize>::new()];
    while let Some(set) = frontier.pop() {
        for h in 0..arr.len() {
            if set.contains(&h) {
                continue;
            }
            let mut cand = set.clone();
            cand.push(h);
            cand.sort_unstable();
            let aug_rank = q.rank(&augmented(arr, &cand));
            if arr.rank_of(&cand) != aug_rank {
                continue;
            }
            let closure: Vec<usize> = (0..arr.len())
                .filter(|&k| {
                    let mut with = cand.clone();
                    with.push(k);
                    q.rank(&augmented(arr, &with)) == aug_rank
                })
                .collect();
            if seen.insert(closure.clone()) {
                frontier.push(closure);
            }
        }
    }
    let mut out: Vec<Flat> = seen.into_iter().map(|hyperplanes| Flat { codim: arr.rank_of(&hyperplanes), hyperplanes }).collect();
    out.sort();
    out
}
