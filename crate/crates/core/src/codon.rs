//! Balanced codons and the symbol/state codon assignment.
//!
//! A codon is a short bit string. Symbols and states are written on the tape
//! in *write form*; tRNA match them with the bitwise complement, the *read
//! form*. Named codons are balanced (exactly `n / 2` one-bits, rounded
//! down), which keeps the all-ones codon free for the halt state and
//! guarantees that no read form of a named state is all zeros.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use indexmap::IndexMap;
use thiserror::Error;

use crate::machine::Alphabet;

pub const MAX_CODON_LEN: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("codon length must be at least 1")]
    ZeroLength,
    #[error("codon length {0} exceeds {MAX_CODON_LEN}")]
    TooLong(usize),
    #[error("`{0}` is not a bit string")]
    BadBits(String),
    #[error("symbol codons must have even length, got {0}")]
    OddSymbolLength(usize),
    #[error("{kind} `{name}`: codon {codon} is not balanced")]
    Unbalanced { kind: &'static str, name: String, codon: Codon },
    #[error("{kind}s `{first}` and `{second}` share codon {codon}")]
    Duplicate { kind: &'static str, first: String, second: String, codon: Codon },
    #[error("state `{name}` uses the halt codon")]
    EqualsHalt { name: String },
    #[error("{needed} {kind}s do not fit in codons of length {len} (capacity {available})")]
    Capacity { kind: &'static str, len: usize, needed: usize, available: u64 },
    #[error("{kind} `{name}`: codon has length {found}, expected {expected}")]
    LengthMismatch { kind: &'static str, name: String, expected: usize, found: usize },
    #[error("{kind} `{name}` is not declared by the machine")]
    UnknownName { kind: &'static str, name: String },
    #[error("no codon for {kind} `{name}`")]
    Uncovered { kind: &'static str, name: String },
    #[error("codec line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// A fixed-length bit string, most significant bit written first.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codon {
    bits: u64,
    len: u8,
}

impl Codon {
    pub fn new(bits: u64, len: usize) -> Result<Codon, CodecError> {
        if len == 0 {
            return Err(CodecError::ZeroLength);
        }
        if len > MAX_CODON_LEN {
            return Err(CodecError::TooLong(len));
        }
        Ok(Codon { bits: bits & mask(len), len: len as u8 })
    }

    pub fn ones(len: usize) -> Codon {
        Codon { bits: mask(len), len: len as u8 }
    }

    pub fn zeros(len: usize) -> Codon {
        Codon { bits: 0, len: len as u8 }
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn len(self) -> usize {
        self.len as usize
    }

    pub fn is_empty(self) -> bool {
        self.len == 0
    }

    pub fn count_ones(self) -> u32 {
        self.bits.count_ones()
    }

    pub fn is_balanced(self) -> bool {
        self.count_ones() as usize == self.len() / 2
    }

    pub fn is_all_ones(self) -> bool {
        self.bits == mask(self.len())
    }

    /// Bitwise complement at the same length.
    pub fn complement(self) -> Codon {
        Codon { bits: !self.bits & mask(self.len()), len: self.len }
    }

    /// Clears the leftmost bit.
    pub fn without_leading_bit(self) -> Codon {
        Codon { bits: self.bits & !(1u64 << (self.len - 1)), len: self.len }
    }
}

fn mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl fmt::Display for Codon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in (0..self.len()).rev() {
            f.write_char(if self.bits >> i & 1 == 1 { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Codon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Codon({self})")
    }
}

impl FromStr for Codon {
    type Err = CodecError;

    fn from_str(s: &str) -> Result<Codon, CodecError> {
        if s.is_empty() {
            return Err(CodecError::ZeroLength);
        }
        if s.len() > MAX_CODON_LEN {
            return Err(CodecError::TooLong(s.len()));
        }
        let mut bits = 0u64;
        for c in s.chars() {
            bits = bits << 1
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => return Err(CodecError::BadBits(s.to_string())),
                };
        }
        Codon::new(bits, s.len())
    }
}

/// Read form of a codon: its complement.
pub fn read_form(codon: Codon) -> Codon {
    codon.complement()
}

/// Number of balanced codons of length `n`, i.e. `C(n, n/2)`.
pub fn capacity(n: usize) -> Result<u64, CodecError> {
    if n == 0 {
        return Err(CodecError::ZeroLength);
    }
    if n > MAX_CODON_LEN {
        return Err(CodecError::TooLong(n));
    }
    let k = (n / 2) as u128;
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n as u128 - i) / (i + 1);
    }
    Ok(c as u64)
}

/// Balanced codons of one length in ascending numeric order.
#[derive(Debug, Clone)]
pub struct Balanced {
    next: Option<u64>,
    len: usize,
}

impl Balanced {
    pub fn new(len: usize) -> Result<Balanced, CodecError> {
        capacity(len)?;
        Ok(Balanced { next: Some(mask(len / 2)), len })
    }
}

impl Iterator for Balanced {
    type Item = Codon;

    fn next(&mut self) -> Option<Codon> {
        let cur = self.next?;
        // Next integer with the same popcount (Gosper's hack).
        self.next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur.checked_add(c);
            r.map(|r| (((r ^ cur) >> 2) / c) | r)
                .filter(|&n| self.len == 64 || n >> self.len == 0)
        };
        Some(Codon { bits: cur, len: self.len as u8 })
    }
}

pub fn enumerate_balanced(n: usize) -> Result<Vec<Codon>, CodecError> {
    Ok(Balanced::new(n)?.collect())
}

/// Shortest codon lengths able to hold the given alphabets: even for
/// symbols, any length for states. The halt codon lies outside the
/// balanced set and is never counted.
pub fn min_lengths(num_symbols: usize, num_states: usize) -> (usize, usize) {
    let fits = |n: usize, needed: usize| capacity(n).map(|c| c >= needed as u64).unwrap_or(false);
    let symbol_len = (1..).map(|k| 2 * k).find(|&n| fits(n, num_symbols)).unwrap_or(2);
    let state_len = (1..).find(|&n| fits(n, num_states)).unwrap_or(1);
    (symbol_len, state_len)
}

/// Explicit codon choices, as read from a codec file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodecOverrides {
    pub symbol_len: Option<usize>,
    pub state_len: Option<usize>,
    pub symbols: IndexMap<String, Codon>,
    pub states: IndexMap<String, Codon>,
}

/// Parses `symbol <name> <bits>`, `state <name> <bits>`, `symbol-len <n>`
/// and `state-len <n>` lines.
pub fn parse_codec_overrides(text: &str) -> Result<CodecOverrides, CodecError> {
    let mut out = CodecOverrides::default();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let syntax = |message: String| CodecError::Syntax { line: line_no, message };
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields.as_slice() {
            [kw @ ("symbol" | "state"), name, bits] => {
                let codon: Codon = bits.parse().map_err(|e: CodecError| syntax(e.to_string()))?;
                let name = crate::machine::normalize_name(name);
                let map = if *kw == "symbol" { &mut out.symbols } else { &mut out.states };
                if map.insert(name.clone(), codon).is_some() {
                    return Err(syntax(format!("{kw} `{name}` assigned twice")));
                }
            }
            [kw @ ("symbol-len" | "state-len"), n] => {
                let n: usize = n.parse().map_err(|_| syntax(format!("`{n}` is not a length")))?;
                let slot = if *kw == "symbol-len" { &mut out.symbol_len } else { &mut out.state_len };
                *slot = Some(n);
            }
            _ => return Err(syntax(format!("cannot parse `{trimmed}`"))),
        }
    }
    Ok(out)
}

pub fn serialize_codec_overrides(o: &CodecOverrides) -> String {
    let mut out = String::new();
    if let Some(n) = o.symbol_len {
        let _ = writeln!(out, "symbol-len {n}");
    }
    if let Some(n) = o.state_len {
        let _ = writeln!(out, "state-len {n}");
    }
    for (name, c) in &o.symbols {
        let _ = writeln!(out, "symbol {name} {c}");
    }
    for (name, c) in &o.states {
        let _ = writeln!(out, "state {name} {c}");
    }
    out
}

/// Assignment of write-form codons to every symbol and state of a machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codec {
    symbol_len: usize,
    state_len: usize,
    symbols: IndexMap<String, Codon>,
    states: IndexMap<String, Codon>,
    halt: Codon,
}

impl Codec {
    pub fn symbol_len(&self) -> usize {
        self.symbol_len
    }

    pub fn state_len(&self) -> usize {
        self.state_len
    }

    pub fn halt(&self) -> Codon {
        self.halt
    }

    pub fn symbol(&self, name: &str) -> Result<Codon, CodecError> {
        self.symbols.get(name).copied().ok_or_else(|| CodecError::Uncovered {
            kind: "symbol",
            name: name.to_string(),
        })
    }

    pub fn state(&self, name: &str) -> Result<Codon, CodecError> {
        self.states.get(name).copied().ok_or_else(|| CodecError::Uncovered {
            kind: "state",
            name: name.to_string(),
        })
    }

    /// Write codon of a rule target: the named state, or halt for `None`.
    pub fn state_or_halt(&self, name: Option<&str>) -> Result<Codon, CodecError> {
        name.map_or(Ok(self.halt), |n| self.state(n))
    }

    pub fn symbol_name(&self, codon: Codon) -> Option<&str> {
        self.symbols.iter().find(|(_, c)| **c == codon).map(|(n, _)| n.as_str())
    }

    pub fn state_name(&self, codon: Codon) -> Option<&str> {
        self.states.iter().find(|(_, c)| **c == codon).map(|(n, _)| n.as_str())
    }

    pub fn symbols(&self) -> impl Iterator<Item = (&str, Codon)> {
        self.symbols.iter().map(|(n, c)| (n.as_str(), *c))
    }

    pub fn states(&self) -> impl Iterator<Item = (&str, Codon)> {
        self.states.iter().map(|(n, c)| (n.as_str(), *c))
    }

    /// The full assignment as explicit overrides.
    pub fn to_overrides(&self) -> CodecOverrides {
        CodecOverrides {
            symbol_len: Some(self.symbol_len),
            state_len: Some(self.state_len),
            symbols: self.symbols.clone(),
            states: self.states.clone(),
        }
    }
}

/// Width of one tRNA row: state slot, symbol cell, state slot.
pub fn trna_width(codec: &Codec) -> usize {
    2 * codec.state_len + codec.symbol_len
}

fn pick_len(
    kind: &'static str,
    explicit: Option<usize>,
    chosen: &IndexMap<String, Codon>,
    fallback: usize,
) -> Result<usize, CodecError> {
    let len = explicit
        .or_else(|| chosen.values().next().map(|c| c.len()))
        .unwrap_or(fallback);
    if len == 0 {
        return Err(CodecError::ZeroLength);
    }
    for (name, c) in chosen {
        if c.len() != len {
            return Err(CodecError::LengthMismatch {
                kind,
                name: name.clone(),
                expected: len,
                found: c.len(),
            });
        }
    }
    Ok(len)
}

fn assign(
    kind: &'static str,
    names: &[String],
    len: usize,
    chosen: &IndexMap<String, Codon>,
    halt: Option<Codon>,
) -> Result<IndexMap<String, Codon>, CodecError> {
    let available = capacity(len)?;
    if (names.len() as u64) > available {
        return Err(CodecError::Capacity { kind, len, needed: names.len(), available });
    }
    for (name, &codon) in chosen {
        if !names.contains(name) {
            return Err(CodecError::UnknownName { kind, name: name.clone() });
        }
        if Some(codon) == halt {
            return Err(CodecError::EqualsHalt { name: name.clone() });
        }
        if !codon.is_balanced() {
            return Err(CodecError::Unbalanced { kind, name: name.clone(), codon });
        }
    }
    let mut owner: IndexMap<Codon, &str> = IndexMap::new();
    for (name, &codon) in chosen {
        if let Some(first) = owner.insert(codon, name) {
            return Err(CodecError::Duplicate {
                kind,
                first: first.to_string(),
                second: name.clone(),
                codon,
            });
        }
    }
    // Names without an explicit codon take the lowest unused balanced codons,
    // in declaration order.
    let mut free = Balanced::new(len)?.filter(|c| !owner.contains_key(c));
    let mut out = IndexMap::new();
    for name in names {
        let codon = match chosen.get(name) {
            Some(&c) => c,
            None => free.next().ok_or(CodecError::Capacity {
                kind,
                len,
                needed: names.len(),
                available,
            })?,
        };
        out.insert(name.clone(), codon);
    }
    Ok(out)
}

/// Builds the codec for a machine. Without overrides the i-th declared
/// symbol/state gets the i-th balanced codon of the minimal length.
pub fn build_codec<A: Alphabet + ?Sized>(
    spec: &A,
    overrides: Option<&CodecOverrides>,
) -> Result<Codec, CodecError> {
    let empty = CodecOverrides::default();
    let o = overrides.unwrap_or(&empty);
    let (min_symbol, min_state) = min_lengths(spec.symbols().len().max(1), spec.states().len().max(1));

    let symbol_len = pick_len("symbol", o.symbol_len, &o.symbols, min_symbol)?;
    if symbol_len % 2 == 1 {
        return Err(CodecError::OddSymbolLength(symbol_len));
    }
    let state_len = pick_len("state", o.state_len, &o.states, min_state)?;
    if symbol_len > MAX_CODON_LEN || state_len > MAX_CODON_LEN {
        return Err(CodecError::TooLong(symbol_len.max(state_len)));
    }
    let halt = Codon::ones(state_len);

    let symbols = assign("symbol", spec.symbols(), symbol_len, &o.symbols, None)?;
    let states = assign("state", spec.states(), state_len, &o.states, Some(halt))?;
    Ok(Codec { symbol_len, state_len, symbols, states, halt })
}
