//! Exact weights used by the potential-function arguments.
//!
//! Binary weights are scaled by `2^k`, so a chip on vertex `i` weighs
//! `2^(k-i)` and a chip on the start vertex weighs 1.

use crate::game::{BoardState, GameError, PathId};

/// Largest index whose Fibonacci number fits in a `u128`.
pub const MAX_FIB_INDEX: u32 = 186;

/// Fibonacci numbers with `F_0 = 0`, `F_1 = 1`.
///
/// Panics above [`MAX_FIB_INDEX`].
pub fn fib(n: u32) -> u128 {
    assert!(n <= MAX_FIB_INDEX, "F_{n} does not fit in 128 bits");
    if n == 0 {
        return 0;
    }
    let (mut a, mut b) = (0u128, 1u128);
    for _ in 1..n {
        (a, b) = (b, a + b);
    }
    b
}

/// Scaled weight `2^(k - position)` of a chip.
pub fn chip_weight(position: usize, k: usize) -> Result<u64, GameError> {
    if position > k {
        return Err(GameError::PositionOutOfRange { position, k });
    }
    if k - position >= 64 {
        return Err(GameError::InvalidConfig(format!("weight 2^{} overflows", k - position)));
    }
    Ok(1u64 << (k - position))
}

/// Scaled weight of all chips on one path.
pub fn path_weight(state: &BoardState, path: PathId) -> u64 {
    let k = state.k();
    state
        .path(path)
        .iter()
        .enumerate()
        .map(|(i, &c)| c as u64 * (1u64 << (k - i)))
        .sum()
}

/// Fibonacci potential of a board in the 1-restricted game: a chip on
/// vertex `i` weighs `F(2(k-i)+2)` on the first path and `F(2(k-i)+1)` on
/// the second.
pub fn fibonacci_potential(state: &BoardState) -> u128 {
    let k = state.k();
    let mut total = 0u128;
    for (p, offset) in [(PathId::First, 2u32), (PathId::Second, 1u32)] {
        for (i, &c) in state.path(p).iter().enumerate() {
            total += c as u128 * fib(2 * (k - i) as u32 + offset);
        }
    }
    total
}

/// Largest `N` covered by the Fibonacci Remover: `floor((F(2k+1) - 1) / 2)`.
pub fn fibonacci_remover_bound(k: usize) -> u128 {
    (fib(2 * k as u32 + 1) - 1) / 2
}

/// Chip count for the tower strategy: `F(2k) + 2k F(k+1)`.
pub fn tower_pusher_chips(k: usize) -> u128 {
    let k32 = k as u32;
    fib(2 * k32) + 2 * k as u128 * fib(k32 + 1)
}

/// Tower weight beyond which no more bucket chips are needed:
/// `(2k-2) F(k+1) + F(k+2) + ... + F(2k-2)`.
pub fn tower_rebuild_limit(k: usize) -> u128 {
    let k32 = k as u32;
    let base = (2 * k as u128).saturating_sub(2) * fib(k32 + 1);
    let tail: u128 = (k32 + 2..=(2 * k32).saturating_sub(2)).map(fib).sum();
    base + tail
}
