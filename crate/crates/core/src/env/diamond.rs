//! Pick-the-diamond boards: `n` slots, each empty or holding one of four
//! polygons. The agent picks a slot; a slot's feature vector is its index
//! and the edge count of its shape. The demonstrated policy picks the
//! rightmost slot among those with the most edges, which `w = [1, 10]`
//! realizes: ten times the edge count dominates any slot index up to nine.

use crate::env::EnvError;
use crate::model::TeachingInstance;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiamondShape {
    Empty,
    Triangle,
    Square,
    Pentagon,
    Hexagon,
}

impl DiamondShape {
    pub const ALL: [DiamondShape; 5] = [
        DiamondShape::Empty,
        DiamondShape::Triangle,
        DiamondShape::Square,
        DiamondShape::Pentagon,
        DiamondShape::Hexagon,
    ];

    pub fn edges(self) -> u32 {
        match self {
            DiamondShape::Empty => 0,
            DiamondShape::Triangle => 3,
            DiamondShape::Square => 4,
            DiamondShape::Pentagon => 5,
            DiamondShape::Hexagon => 6,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            DiamondShape::Empty => 'o',
            DiamondShape::Triangle => 't',
            DiamondShape::Square => 's',
            DiamondShape::Pentagon => 'p',
            DiamondShape::Hexagon => 'h',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.symbol() == c)
    }
}

/// One board; slot 1 is the leftmost entry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiamondBoard {
    pub slots: Vec<DiamondShape>,
}

impl DiamondBoard {
    /// Board number `index` in base five, least significant digit = slot 1.
    /// Index 0 is the all-empty board.
    pub fn from_index(n: usize, index: usize) -> Self {
        let mut slots = Vec::with_capacity(n);
        let mut rest = index;
        for _ in 0..n {
            slots.push(DiamondShape::ALL[rest % 5]);
            rest /= 5;
        }
        Self { slots }
    }

    pub fn from_id(id: &str) -> Option<Self> {
        id.chars()
            .map(DiamondShape::from_symbol)
            .collect::<Option<Vec<_>>>()
            .map(|slots| Self { slots })
    }

    pub fn id(&self) -> String {
        self.slots.iter().map(|s| s.symbol()).collect()
    }

    /// Zero-based slot the policy picks: rightmost among maximal edge
    /// counts. None only on the all-empty board.
    pub fn target_slot(&self) -> Option<usize> {
        if self.slots.iter().all(|&s| s == DiamondShape::Empty) {
            return None;
        }
        let best = self.slots.iter().map(|s| s.edges()).max().unwrap();
        self.slots.iter().rposition(|s| s.edges() == best)
    }
}

/// All `5^n - 1` non-empty boards with `n` slots, in board-index order.
/// Features are `[slot, edges]`, so every difference vector is integral.
pub fn gen_diamond(n: usize) -> Result<TeachingInstance, EnvError> {
    if !(1..=9).contains(&n) {
        return Err(EnvError::InvalidParam(format!(
            "diamond boards support 1 to 9 slots, got {n}"
        )));
    }
    let count = 5usize.pow(n as u32);
    let mut states = Vec::with_capacity(count - 1);
    let mut features = Vec::with_capacity(count - 1);
    let mut target = Vec::with_capacity(count - 1);
    for index in 1..count {
        let board = DiamondBoard::from_index(n, index);
        let row: Vec<Vec<f64>> = board
            .slots
            .iter()
            .enumerate()
            .map(|(slot, shape)| vec![(slot + 1) as f64, shape.edges() as f64])
            .collect();
        target.push(board.target_slot().expect("board index 0 is skipped"));
        states.push(board.id());
        features.push(row);
    }
    let actions = (1..=n).map(|a| a.to_string()).collect();
    Ok(TeachingInstance::new(2, states, actions, features, target)?)
}
