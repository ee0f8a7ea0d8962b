//! Test oracles written without the library's move generator or solver.

#![allow(dead_code)]

use chipgame::{GameVariant, Outcome};

/// Plain minimax over raw count vectors; no memo, no symmetry.
pub fn naive_outcome(k: usize, n: u32, variant: GameVariant) -> Outcome {
    let start = [
        (0..=k).map(|i| if i == k { n } else { 0 }).collect::<Vec<u32>>(),
        (0..=k).map(|i| if i == k { n } else { 0 }).collect::<Vec<u32>>(),
    ];
    if pusher_wins(&start, variant) {
        Outcome::PusherWin
    } else {
        Outcome::RemoverWin
    }
}

fn over(board: &[Vec<u32>; 2]) -> Option<bool> {
    if board.iter().any(|p| p[0] > 0) {
        Some(true)
    } else if board.iter().all(|p| p.iter().all(|&c| c == 0)) {
        Some(false)
    } else {
        None
    }
}

/// Every way to pick chips from vertices `1..=k` of one path, at most `cap` in total.
fn path_moves(path: &[u32], cap: Option<u32>) -> Vec<Vec<u32>> {
    let mut out = vec![vec![0; path.len()]];
    for i in 1..path.len() {
        let mut next = Vec::new();
        for m in &out {
            let used: u32 = m.iter().sum();
            for take in 0..=path[i] {
                if cap.is_some_and(|c| used + take > c) {
                    break;
                }
                let mut x = m.clone();
                x[i] = take;
                next.push(x);
            }
        }
        out = next;
    }
    out
}

fn pusher_wins(board: &[Vec<u32>; 2], variant: GameVariant) -> bool {
    if let Some(result) = over(board) {
        return result;
    }
    let cap = match variant {
        GameVariant::General => None,
        GameVariant::Restricted { c } => Some(c),
        GameVariant::MakerBreaker => Some(1),
    };
    let first = path_moves(&board[0], cap);
    let second = path_moves(&board[1], cap);
    for a in &first {
        for b in &second {
            let moved = [a, b];
            if moved.iter().all(|m| m.iter().all(|&x| x == 0)) {
                continue;
            }
            let mut after = board.clone();
            for p in 0..2 {
                for i in 1..after[p].len() {
                    after[p][i] -= moved[p][i];
                    after[p][i - 1] += moved[p][i];
                }
            }
            let mut all_lose = true;
            for next in removals(&after, moved, variant) {
                if !pusher_wins(&next, variant) {
                    all_lose = false;
                    break;
                }
            }
            if all_lose {
                return true;
            }
        }
    }
    false
}

fn removals(after: &[Vec<u32>; 2], moved: [&Vec<u32>; 2], variant: GameVariant) -> Vec<[Vec<u32>; 2]> {
    let mut out = Vec::new();
    if variant == GameVariant::MakerBreaker {
        for p in 0..2 {
            for i in 0..after[p].len() {
                if after[p][i] > 0 {
                    let mut x = after.clone();
                    x[p][i] -= 1;
                    out.push(x);
                }
            }
        }
        return out;
    }
    for p in 0..2 {
        if moved[p].iter().all(|&x| x == 0) {
            continue;
        }
        let mut x = after.clone();
        for i in 1..moved[p].len() {
            x[p][i - 1] -= moved[p][i];
        }
        out.push(x);
    }
    out
}

/// Fibonacci numbers by the defining recurrence, `F(1) = F(2) = 1`.
pub fn fib_ref(n: u32) -> u128 {
    let mut v: Vec<u128> = vec![0, 1];
    while v.len() <= n as usize {
        let l = v.len();
        v.push(v[l - 1] + v[l - 2]);
    }
    v[n as usize]
}
