//! Brute-force references. Deliberately share no code with the fast paths.

use crate::error::{Error, Result};
use crate::knapsack::{KnapsackInstance, KnapsackSolution};
use crate::seq::{IntSeq, PartialSeq};

pub const MAX_BRUTE_ITEMS: usize = 24;
pub const MAX_BRUTE_PAIRS: usize = 1 << 22;

/// Exact optimum by enumerating all `2^n` subsets; ties go to the
/// lexicographically smallest mask.
pub fn brute_knapsack(inst: &KnapsackInstance) -> Result<KnapsackSolution> {
    let items = inst.items();
    if items.len() > MAX_BRUTE_ITEMS {
        return Err(Error::TooLarge(format!("{} items exceed {}", items.len(), MAX_BRUTE_ITEMS)));
    }
    let cap = inst.capacity() as u128;
    let (mut best_mask, mut best_p, mut best_w) = (0u32, 0u128, 0u128);
    for mask in 0u32..(1 << items.len()) {
        let (mut p, mut w) = (0u128, 0u128);
        for (k, it) in items.iter().enumerate() {
            if mask >> k & 1 == 1 {
                p += it.profit as u128;
                w += it.weight as u128;
            }
        }
        if w <= cap && p > best_p {
            (best_mask, best_p, best_w) = (mask, p, w);
        }
    }
    Ok(KnapsackSolution {
        value: best_p as u64,
        chosen: (0..items.len()).filter(|&k| best_mask >> k & 1 == 1).collect(),
        weight: best_w as u64,
    })
}

/// Double-loop `(min, +)` over `f[I] x g[J]`.
pub fn brute_box_minplus(f: &IntSeq, g: &IntSeq) -> Result<PartialSeq> {
    let (a, b) = (f.values(), g.values());
    if a.len().saturating_mul(b.len()) > MAX_BRUTE_PAIRS {
        return Err(Error::TooLarge(format!("{} x {} box", a.len(), b.len())));
    }
    let mut out: Vec<Option<i64>> = vec![None; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            let slot = &mut out[i + j];
            let v = x + y;
            if slot.is_none_or(|cur| v < cur) {
                *slot = Some(v);
            }
        }
    }
    Ok(PartialSeq::from_entries(f.offset() + g.offset(), out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knapsack::Item;

    fn inst(items: &[(u64, u64)], cap: u64) -> KnapsackInstance {
        KnapsackInstance::new(items.iter().map(|&(p, w)| Item::new(p, w)).collect(), cap).unwrap()
    }

    #[test]
    fn knapsack_examples() {
        let s = brute_knapsack(&inst(&[(3, 2), (4, 3), (5, 4)], 6)).unwrap();
        assert_eq!((s.value, s.chosen, s.weight), (8, vec![0, 2], 6));
        assert_eq!(brute_knapsack(&inst(&[(3, 2)], 0)).unwrap(), KnapsackSolution::empty());
        assert_eq!(brute_knapsack(&inst(&[(9, 2)], 2)).unwrap().value, 9);
        let big: Vec<(u64, u64)> = vec![(1, 1); 25];
        assert!(brute_knapsack(&inst(&big, 3)).is_err());
    }

    #[test]
    fn box_examples() {
        let f = IntSeq::new(2, vec![0, 1]);
        let g = IntSeq::new(5, vec![0, 2]);
        let h = brute_box_minplus(&f, &g).unwrap();
        assert_eq!(h.offset(), 7);
        assert_eq!(h.entries(), vec![Some(0), Some(1), Some(3)]);
        let sets = brute_box_minplus(&IntSeq::from_values(vec![1, 2]), &IntSeq::from_values(vec![0, 2])).unwrap();
        assert_eq!(sets.entries(), vec![Some(1), Some(2), Some(4)]);
        let long = IntSeq::from_values(vec![0; 1 << 12]);
        assert!(brute_box_minplus(&long, &IntSeq::from_values(vec![0; 1 << 11])).is_err());
    }
}
