//! Brute-force square/domino tilings of a `1 x n` board.
//!
//! Cells are numbered from 1. A domino covering cells `(i, i+1)` sits at
//! position `i` and carries the weight `w_i`; a tiling weighs the product of
//! its domino weights. Position `m` is a fault when no domino covers
//! `(m, m+1)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::poly::{Monomial, Poly, Var};

/// Default largest board the enumerator accepts.
pub const DEFAULT_CAP: usize = 32;

/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "WFIB_TILE_CAP";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TilingError {
    #[error("board length {n} exceeds the enumeration cap {cap}")]
    TooLarge { n: usize, cap: usize },
}

/// Reads the cap from [`CAP_ENV`], falling back to [`DEFAULT_CAP`].
pub fn cap_from_env() -> usize {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Tile {
    Square,
    Domino,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tiling {
    tiles: Vec<Tile>,
}

impl Tiling {
    pub fn new(tiles: Vec<Tile>) -> Self {
        Tiling { tiles }
    }

    pub fn all_squares(n: usize) -> Self {
        Tiling::new(vec![Tile::Square; n])
    }

    /// `n / 2` dominoes; `n` must be even.
    pub fn all_dominoes(n: usize) -> Self {
        assert!(n.is_multiple_of(2), "an odd board has no all-domino tiling");
        Tiling::new(vec![Tile::Domino; n / 2])
    }

    pub fn tiles(&self) -> &[Tile] {
        &self.tiles
    }

    pub fn len(&self) -> usize {
        self.tiles
            .iter()
            .map(|t| match t {
                Tile::Square => 1,
                Tile::Domino => 2,
            })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn domino_count(&self) -> usize {
        self.tiles.iter().filter(|t| **t == Tile::Domino).count()
    }

    /// Positions `i` of the dominoes covering `(i, i+1)`, increasing.
    pub fn domino_positions(&self) -> Vec<usize> {
        let mut cell = 1;
        let mut out = Vec::new();
        for t in &self.tiles {
            match t {
                Tile::Square => cell += 1,
                Tile::Domino => {
                    out.push(cell);
                    cell += 2;
                }
            }
        }
        out
    }

    /// The product of `w_i` over domino positions.
    pub fn weight(&self) -> Poly {
        self.weight_shifted(0)
    }

    /// The weight of this tiling placed `offset` cells to the right, so a
    /// domino at local position `i` weighs `w_{i + offset}`.
    pub fn weight_shifted(&self, offset: usize) -> Poly {
        let m = Monomial::from_powers(
            self.domino_positions()
                .into_iter()
                .map(|i| (Var::W((i + offset) as u32), 1)),
        );
        Poly::term(1, m)
    }

    /// Cuts between cells where no domino straddles, including the two board
    /// ends: `0` (before cell 1) through `len`.
    fn cuts(&self) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        let mut cell = 0;
        out.insert(0);
        for t in &self.tiles {
            cell += match t {
                Tile::Square => 1,
                Tile::Domino => 2,
            };
            out.insert(cell);
        }
        out
    }

    /// Splits at a cut: tiles covering cells `1..=at` and the rest.
    fn split_at_cut(&self, at: usize) -> (Vec<Tile>, Vec<Tile>) {
        let mut cell = 0;
        let mut idx = 0;
        while cell < at {
            cell += match self.tiles[idx] {
                Tile::Square => 1,
                Tile::Domino => 2,
            };
            idx += 1;
        }
        debug_assert_eq!(cell, at, "split point is not a cut");
        (self.tiles[..idx].to_vec(), self.tiles[idx..].to_vec())
    }
}

impl fmt::Display for Tiling {
    /// `S D D S`, or `-` for the empty tiling.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tiles.is_empty() {
            return f.write_str("-");
        }
        let s: Vec<&str> = self
            .tiles
            .iter()
            .map(|t| match t {
                Tile::Square => "S",
                Tile::Domino => "D",
            })
            .collect();
        f.write_str(&s.join(" "))
    }
}

/// The fault positions of a tiling, a subset of `1..n`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FaultSet(pub BTreeSet<usize>);

impl FaultSet {
    pub fn contains(&self, m: usize) -> bool {
        self.0.contains(&m)
    }

    pub fn positions(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

pub fn faults(t: &Tiling) -> FaultSet {
    let n = t.len();
    let covered: BTreeSet<usize> = t.domino_positions().into_iter().collect();
    FaultSet((1..n).filter(|m| !covered.contains(m)).collect())
}

/// All tilings of an `n`-board with no domino at positions `1..=m`, in
/// square-first order.
pub fn enumerate_tilings(n: usize, m: usize) -> Result<Vec<Tiling>, TilingError> {
    enumerate_tilings_capped(n, m, DEFAULT_CAP)
}

pub fn enumerate_tilings_capped(
    n: usize,
    m: usize,
    cap: usize,
) -> Result<Vec<Tiling>, TilingError> {
    if n > cap {
        return Err(TilingError::TooLarge { n, cap });
    }
    let mut out = Vec::new();
    let mut stack = Vec::new();
    extend(n, m, 1, &mut stack, &mut out);
    Ok(out)
}

fn extend(n: usize, m: usize, cell: usize, stack: &mut Vec<Tile>, out: &mut Vec<Tiling>) {
    if cell == n + 1 {
        out.push(Tiling::new(stack.clone()));
        return;
    }
    stack.push(Tile::Square);
    extend(n, m, cell + 1, stack, out);
    stack.pop();
    if cell < n && cell > m {
        stack.push(Tile::Domino);
        extend(n, m, cell + 2, stack, out);
        stack.pop();
    }
}

/// Total weight of the tilings of an `n`-board with no domino in the first
/// `m` positions. On an `(m + k)`-board this is `f^{(m)}_{k+1}`.
pub fn total_weight(n: usize, m: usize) -> Result<Poly, TilingError> {
    total_weight_capped(n, m, DEFAULT_CAP)
}

pub fn total_weight_capped(n: usize, m: usize, cap: usize) -> Result<Poly, TilingError> {
    let tilings = enumerate_tilings_capped(n, m, cap)?;
    Ok(Poly::from_terms(tilings.iter().flat_map(|t| {
        t.weight()
            .terms()
            .map(|(m, c)| (c.clone(), m.clone()))
            .collect::<Vec<_>>()
    })))
}

/// Total weight of the tilings made of exactly `n_tiles` tiles, `k` of them
/// dominoes (board length `n_tiles + k`). Zero when `k` is out of range.
pub fn total_weight_by_tiles(n_tiles: usize, k: i64) -> Result<Poly, TilingError> {
    if k < 0 || k as usize > n_tiles {
        return Ok(Poly::zero());
    }
    let k = k as usize;
    let board = n_tiles + k;
    let tilings = enumerate_tilings(board, 0)?;
    Ok(tilings
        .iter()
        .filter(|t| t.domino_count() == k)
        .fold(Poly::zero(), |acc, t| acc.add(&t.weight())))
}

/// The greatest position that is an interior fault of `top` and, shifted
/// back by `offset`, an interior fault of `bottom`.
pub fn last_common_fault(top: &Tiling, bottom: &Tiling, offset: usize) -> Option<usize> {
    let ft = faults(top);
    let fb = faults(bottom);
    ft.0.iter()
        .rev()
        .copied()
        .find(|&m| m >= offset && fb.contains(m - offset))
}

/// The greatest cut shared by `top` and `bottom` (shifted right by
/// `offset`), counting board ends as cuts. This is the break point of the
/// tail-swap argument.
pub fn last_common_cut(top: &Tiling, bottom: &Tiling, offset: usize) -> Option<usize> {
    let ct = top.cuts();
    let cb = bottom.cuts();
    ct.iter()
        .rev()
        .copied()
        .find(|&k| k >= offset && cb.contains(&(k - offset)))
}

/// Swaps the tails of `top` and `bottom` after their last common cut.
/// The result has the same common cut, so applying it twice is the
/// identity; the pair weight `W(top) * W(bottom shifted by offset)` is
/// preserved.
pub fn tail_swap(top: &Tiling, bottom: &Tiling, offset: usize) -> Option<(Tiling, Tiling)> {
    let k = last_common_cut(top, bottom, offset)?;
    let (top_head, top_tail) = top.split_at_cut(k);
    let (bottom_head, bottom_tail) = bottom.split_at_cut(k - offset);
    let new_top = [top_head, bottom_tail].concat();
    let new_bottom = [bottom_head, top_tail].concat();
    Some((Tiling::new(new_top), Tiling::new(new_bottom)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use Tile::{Domino as D, Square as S};

    fn w(i: u32) -> Poly {
        Poly::w(i)
    }

    #[test]
    fn empty_board() {
        let ts = enumerate_tilings(0, 0).unwrap();
        assert_eq!(ts.len(), 1);
        assert!(ts[0].is_empty());
        assert_eq!(total_weight(0, 0).unwrap(), Poly::one());
    }

    #[test]
    fn shifted_seven_board() {
        let ts = enumerate_tilings(7, 3).unwrap();
        assert_eq!(ts.len(), 5);
        let expect = Poly::one() + w(4) + w(5) + w(6) + w(4) * w(6);
        assert_eq!(total_weight(7, 3).unwrap(), expect);
        assert!(ts.iter().any(|t| t.domino_positions() == vec![4, 6]));
    }

    #[test]
    fn four_board() {
        let ts = enumerate_tilings(4, 0).unwrap();
        assert_eq!(ts.len(), 5);
        let expect = Poly::one() + w(1) + w(2) + w(3) + w(1) * w(3);
        assert_eq!(total_weight(4, 0).unwrap(), expect);
        // square-first order
        assert_eq!(ts[0].to_string(), "S S S S");
        assert_eq!(ts[4].to_string(), "D D");
    }

    #[test]
    fn unit_weights_give_fibonacci() {
        let v: BigInt = total_weight(6, 0)
            .unwrap()
            .eval(|_| Some(BigInt::from(1)))
            .unwrap();
        assert_eq!(v, BigInt::from(13));
        let (mut a, mut b) = (1usize, 1usize);
        for n in 0..=16 {
            assert_eq!(enumerate_tilings(n, 0).unwrap().len(), a);
            (a, b) = (b, a + b);
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert_eq!(
            enumerate_tilings(33, 0).unwrap_err(),
            TilingError::TooLarge { n: 33, cap: 32 }
        );
        assert!(enumerate_tilings_capped(5, 0, 4).is_err());
    }

    #[test]
    fn seven_board_example_weight() {
        let t = Tiling::new(vec![S, D, S, D, S]);
        assert_eq!(t.len(), 7);
        assert_eq!(t.domino_positions(), vec![2, 5]);
        assert_eq!(t.weight(), w(2) * w(5));
        assert_eq!(faults(&t).positions(), vec![1, 3, 4, 6]);
    }

    #[test]
    fn by_tiles() {
        for n in 0..6 {
            assert_eq!(total_weight_by_tiles(n, 0).unwrap(), Poly::one());
            assert!(total_weight_by_tiles(n, n as i64 + 1).unwrap().is_zero());
            assert!(total_weight_by_tiles(n, -1).unwrap().is_zero());
        }
        assert_eq!(total_weight_by_tiles(3, 1).unwrap(), w(1) + w(2) + w(3));
    }

    #[test]
    fn fault_sets() {
        assert_eq!(faults(&Tiling::all_squares(4)).positions(), vec![1, 2, 3]);
        assert_eq!(faults(&Tiling::all_dominoes(4)).positions(), vec![2]);
        assert!(faults(&Tiling::all_squares(1)).positions().is_empty());
    }

    #[test]
    fn common_faults() {
        let s5 = Tiling::all_squares(5);
        assert_eq!(last_common_fault(&s5, &s5, 0), Some(4));
        let d2 = Tiling::all_dominoes(2);
        assert_eq!(last_common_fault(&d2, &d2, 0), None);
        // Longer all-domino boards share their seams when aligned, and share
        // nothing when staggered by one cell.
        let d6 = Tiling::all_dominoes(6);
        assert_eq!(last_common_fault(&d6, &d6, 0), Some(4));
        assert_eq!(last_common_fault(&d6, &d6, 1), None);
        let d4 = Tiling::all_dominoes(4);
        let s4 = Tiling::all_squares(4);
        assert_eq!(last_common_fault(&d4, &s4, 0), Some(2));
    }

    #[test]
    fn tail_swap_example() {
        // top: S D over cells 1..3, bottom shifted by 1: D S over cells 2..4
        let top = Tiling::new(vec![S, D]);
        let bottom = Tiling::new(vec![D, S]);
        assert_eq!(last_common_cut(&top, &bottom, 1), Some(3));
        let (t2, b2) = tail_swap(&top, &bottom, 1).unwrap();
        assert_eq!(t2.to_string(), "S D S");
        assert_eq!(b2.to_string(), "D");
        assert_eq!(
            top.weight() * bottom.weight_shifted(1),
            t2.weight() * b2.weight_shifted(1)
        );
        assert_eq!(tail_swap(&t2, &b2, 1), Some((top, bottom)));
    }

    #[test]
    fn all_domino_overlap_has_no_common_cut() {
        // Vajda configuration i = 0, n = 2, j = 0: top 2-board, bottom
        // 2-board shifted by 1.
        let top = Tiling::all_dominoes(2);
        let bottom = Tiling::all_dominoes(2);
        assert_eq!(last_common_cut(&top, &bottom, 1), None);
    }
}
