//! The interleaved codon tape: state slot, symbol cell, state slot, ...
//!
//! Symbol cell `i` is flanked by state slots `i` and `i + 1`; together they
//! form window `i`. All slots hold the halt codon except at most one, which
//! holds the current state next to the head.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::codon::{Codec, CodecError, Codon};
use crate::machine::MachineSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TapeError {
    #[error("tape is empty, there is no cell under the head")]
    Empty,
    #[error("head {head} is outside a tape of {len} cells")]
    HeadOutOfRange { head: usize, len: usize },
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error("cell {index} holds {codon}, which encodes no {kind}")]
    UnknownCodon { index: usize, kind: &'static str, codon: Codon },
    #[error("state slots {first} and {second} are both occupied")]
    MultipleStates { first: usize, second: usize },
    #[error("malformed tape text: {0}")]
    Malformed(String),
}

/// One end of the tape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Edge {
    Left,
    Right,
}

/// The three fields under a window, or of a tRNA row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CodonTriple {
    pub left: Codon,
    pub symbol: Codon,
    pub right: Codon,
}

impl CodonTriple {
    pub fn new(left: Codon, symbol: Codon, right: Codon) -> CodonTriple {
        CodonTriple { left, symbol, right }
    }

    /// Fieldwise complement.
    pub fn complement(self) -> CodonTriple {
        CodonTriple::new(self.left.complement(), self.symbol.complement(), self.right.complement())
    }
}

impl fmt::Display for CodonTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}_{}", self.left, self.symbol, self.right)
    }
}

impl Serialize for CodonTriple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedTape {
    cells: Vec<Codon>,
    window: usize,
    origin: i64,
}

impl EncodedTape {
    /// Builds a tape from raw cells. `cells` must alternate slot/symbol and
    /// start and end with a slot.
    pub fn from_cells(cells: Vec<Codon>, window: usize, origin: i64) -> Result<EncodedTape, TapeError> {
        if cells.len() < 3 || cells.len().is_multiple_of(2) {
            return Err(TapeError::Malformed(format!("{} cells cannot alternate slot/symbol", cells.len())));
        }
        let len = cells.len() / 2;
        if window >= len {
            return Err(TapeError::HeadOutOfRange { head: window, len });
        }
        let (slot_len, symbol_len) = (cells[0].len(), cells[1].len());
        if let Some(i) = cells
            .iter()
            .enumerate()
            .position(|(i, c)| c.len() != if i % 2 == 0 { slot_len } else { symbol_len })
        {
            return Err(TapeError::Malformed(format!("cell {i} has the wrong length")));
        }
        Ok(EncodedTape { cells, window, origin })
    }

    /// Parses the underscore-joined text form.
    pub fn parse(text: &str, window: usize, origin: i64) -> Result<EncodedTape, TapeError> {
        let cells = text
            .trim()
            .split('_')
            .map(|f| f.parse::<Codon>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| TapeError::Malformed(e.to_string()))?;
        EncodedTape::from_cells(cells, window, origin)
    }

    pub fn cells(&self) -> &[Codon] {
        &self.cells
    }

    /// Number of symbol cells.
    pub fn len(&self) -> usize {
        self.cells.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// Absolute position of symbol cell 0.
    pub fn origin(&self) -> i64 {
        self.origin
    }

    pub fn slot(&self, i: usize) -> Codon {
        self.cells[2 * i]
    }

    pub fn symbol(&self, i: usize) -> Codon {
        self.cells[2 * i + 1]
    }

    pub fn slots(&self) -> impl Iterator<Item = Codon> + '_ {
        self.cells.iter().step_by(2).copied()
    }

    pub fn symbol_cells(&self) -> impl Iterator<Item = Codon> + '_ {
        self.cells.iter().skip(1).step_by(2).copied()
    }

    pub fn window_fields(&self) -> CodonTriple {
        let i = 2 * self.window;
        CodonTriple::new(self.cells[i], self.cells[i + 1], self.cells[i + 2])
    }

    pub fn set_window_fields(&mut self, t: CodonTriple) {
        let i = 2 * self.window;
        self.cells[i..i + 3].copy_from_slice(&[t.left, t.symbol, t.right]);
    }

    /// Moves the window by one cell, growing the tape with `blank` when it
    /// would leave the encoded region.
    pub fn shift(&mut self, edge: Edge, blank: Codon) {
        match edge {
            Edge::Left => {
                if self.window == 0 {
                    self.grow_in_place(Edge::Left, blank);
                }
                self.window -= 1;
            }
            Edge::Right => {
                if self.window + 1 == self.len() {
                    self.grow_in_place(Edge::Right, blank);
                }
                self.window += 1;
            }
        }
    }

    /// Adds one `blank` symbol cell and one halt slot at `edge`.
    pub fn grow(mut self, edge: Edge, blank: Codon) -> EncodedTape {
        self.grow_in_place(edge, blank);
        self
    }

    fn grow_in_place(&mut self, edge: Edge, blank: Codon) {
        let halt = Codon::ones(self.cells[0].len());
        match edge {
            Edge::Right => self.cells.extend([blank, halt]),
            Edge::Left => {
                self.cells.splice(0..0, [halt, blank]);
                self.origin -= 1;
                self.window += 1;
            }
        }
    }

    /// Indices of state slots that do not hold the halt codon.
    pub fn occupied_slots(&self) -> Vec<usize> {
        let halt = Codon::ones(self.cells[0].len());
        self.slots().enumerate().filter(|(_, c)| *c != halt).map(|(i, _)| i).collect()
    }
}

impl fmt::Display for EncodedTape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.cells.iter().enumerate() {
            if i > 0 {
                f.write_str("_")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Encodes the initial tape: symbols separated by halt slots, with the
/// initial state in the slot left of the head cell.
pub fn encode_tape(spec: &MachineSpec, codec: &Codec) -> Result<EncodedTape, TapeError> {
    if spec.tape.is_empty() {
        return Err(TapeError::Empty);
    }
    if spec.head >= spec.tape.len() {
        return Err(TapeError::HeadOutOfRange { head: spec.head, len: spec.tape.len() });
    }
    let mut cells = Vec::with_capacity(2 * spec.tape.len() + 1);
    for (i, sym) in spec.tape.iter().enumerate() {
        cells.push(if i == spec.head { codec.state(&spec.initial_state)? } else { codec.halt() });
        cells.push(codec.symbol(sym)?);
    }
    cells.push(codec.halt());
    Ok(EncodedTape { cells, window: spec.head, origin: 0 })
}

/// A tape read back into symbol names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodedTape {
    pub symbols: Vec<String>,
    /// `None` when every slot holds the halt codon.
    pub state: Option<String>,
    /// Symbol-cell index of the head; `None` when halted.
    pub head: Option<usize>,
    pub origin: i64,
}

impl DecodedTape {
    pub fn head_position(&self) -> Option<i64> {
        self.head.map(|h| self.origin + h as i64)
    }

    /// Symbols concatenated, or space-separated when any name is longer
    /// than one character.
    pub fn symbol_string(&self) -> String {
        let sep = if self.symbols.iter().all(|s| s.chars().count() == 1) { "" } else { " " };
        self.symbols.join(sep)
    }
}

pub fn decode_tape(tape: &EncodedTape, codec: &Codec) -> Result<DecodedTape, TapeError> {
    let symbols = tape
        .symbol_cells()
        .enumerate()
        .map(|(i, c)| {
            codec.symbol_name(c).map(str::to_string).ok_or(TapeError::UnknownCodon {
                index: 2 * i + 1,
                kind: "symbol",
                codon: c,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let occupied = tape.occupied_slots();
    let (state, head) = match occupied.as_slice() {
        [] => (None, None),
        [slot] => {
            let codon = tape.slot(*slot);
            let name = codec.state_name(codon).ok_or(TapeError::UnknownCodon {
                index: 2 * slot,
                kind: "state",
                codon,
            })?;
            // Slot i borders cells i - 1 and i; prefer the simulator's window.
            let w = tape.window();
            let head = if w == *slot || w + 1 == *slot {
                w
            } else if *slot < tape.len() {
                *slot
            } else {
                slot - 1
            };
            (Some(name.to_string()), Some(head))
        }
        [first, second, ..] => {
            return Err(TapeError::MultipleStates { first: *first, second: *second });
        }
    };
    Ok(DecodedTape { symbols, state, head, origin: tape.origin() })
}
