//! Ordered-cumulant (Van Kampen) form of the first four generator orders.
//!
//! The term lists are tabulated rather than generated: the textual
//! construction rule for ordered cumulants does not pin down which
//! three-block products belong to the fourth order, so only the known
//! lists are reproduced and orders above four are refused.

use std::fmt;

use crate::error::{Result, TclError};

/// Highest tabulated order.
pub const MAX_VANKAMPEN_ORDER: usize = 4;

/// One product of ordered averages. Label `0` is the fixed time `t`, label
/// `k >= 1` is the k-th integration variable; variables are integrated over
/// `t > tau_1 > tau_2 > ...`. Each block lists its labels in chronological
/// order (latest first).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VKTerm {
    pub blocks: Vec<Vec<usize>>,
    pub coefficient: i64,
}

impl VKTerm {
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

impl fmt::Display for VKTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if self.coefficient < 0 { '-' } else { '+' })?;
        for block in &self.blocks {
            let labels: Vec<String> = block
                .iter()
                .map(|&l| {
                    if l == 0 {
                        "t".to_string()
                    } else {
                        format!("tau{l}")
                    }
                })
                .collect();
            write!(
                f,
                "<{}>",
                labels
                    .iter()
                    .map(|l| format!("V-_{l}"))
                    .collect::<Vec<_>>()
                    .join(" ")
            )?;
        }
        Ok(())
    }
}

type Table = &'static [(i64, &'static [&'static [usize]])];

const ORDER_1: Table = &[(1, &[&[0]])];

const ORDER_2: Table = &[(1, &[&[0, 1]]), (-1, &[&[0], &[1]])];

const ORDER_3: Table = &[
    (1, &[&[0, 1, 2]]),
    (-1, &[&[0, 1], &[2]]),
    (-1, &[&[0, 2], &[1]]),
    (-1, &[&[0], &[1, 2]]),
    (1, &[&[0], &[1], &[2]]),
    (1, &[&[0], &[2], &[1]]),
];

const ORDER_4: Table = &[
    (1, &[&[0, 1, 2, 3]]),
    (-1, &[&[0, 1, 2], &[3]]),
    (-1, &[&[0, 1, 3], &[2]]),
    (-1, &[&[0, 2, 3], &[1]]),
    (-1, &[&[0, 1], &[2, 3]]),
    (-1, &[&[0, 2], &[1, 3]]),
    (-1, &[&[0, 3], &[1, 2]]),
    (-1, &[&[0], &[1, 2, 3]]),
    (1, &[&[0, 1], &[2], &[3]]),
    (1, &[&[0, 1], &[3], &[2]]),
    (1, &[&[0, 2], &[1], &[3]]),
    (1, &[&[0, 2], &[3], &[1]]),
    (1, &[&[0, 3], &[1], &[2]]),
    (1, &[&[0, 3], &[2], &[1]]),
    (-1, &[&[0], &[1], &[2], &[3]]),
    (-1, &[&[0], &[1], &[3], &[2]]),
    (-1, &[&[0], &[2], &[1], &[3]]),
    (-1, &[&[0], &[2], &[3], &[1]]),
    (-1, &[&[0], &[3], &[1], &[2]]),
    (-1, &[&[0], &[3], &[2], &[1]]),
];

/// Ordered-cumulant terms of the n-th generator order, `1 <= n <= 4`.
pub fn vankampen_terms(n: usize) -> Result<Vec<VKTerm>> {
    let table = match n {
        1 => ORDER_1,
        2 => ORDER_2,
        3 => ORDER_3,
        4 => ORDER_4,
        0 => {
            return Err(TclError::Order {
                order: 0,
                reason: "not positive",
            })
        }
        _ => {
            return Err(TclError::Order {
                order: n,
                reason: "Van Kampen lists are tabulated up to order 4 only",
            })
        }
    };
    Ok(table
        .iter()
        .map(|&(c, blocks)| VKTerm {
            blocks: blocks.iter().map(|b| b.to_vec()).collect(),
            coefficient: c,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn counts() {
        let counts: Vec<usize> = (1..=4).map(|n| vankampen_terms(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 2, 6, 20]);
        assert!(vankampen_terms(5).is_err());
        assert!(vankampen_terms(0).is_err());
    }

    #[test]
    fn first_order_is_single_average() {
        assert_eq!(
            vankampen_terms(1).unwrap(),
            vec![VKTerm {
                blocks: vec![vec![0]],
                coefficient: 1
            }]
        );
    }

    #[test]
    fn structural_invariants() {
        for n in 1..=4 {
            for term in vankampen_terms(n).unwrap() {
                assert_eq!(term.blocks[0][0], 0);
                let q = term.block_count() as u32;
                assert_eq!(term.coefficient, (-1i64).pow(q - 1));
                let labels: BTreeSet<usize> = term.blocks.iter().flatten().copied().collect();
                assert_eq!(labels, (0..n).collect());
                for block in &term.blocks {
                    // chronological: labels increase as times decrease
                    assert!(block.windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }

    #[test]
    fn display() {
        let t = &vankampen_terms(2).unwrap()[1];
        assert_eq!(t.to_string(), "-<V-_t><V-_tau1>");
    }
}
