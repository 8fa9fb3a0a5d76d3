//! Fixed-size per-operator state and its update recurrences.

/// State of one temporal operator. Sizes are fixed when the monitor is
/// compiled; ring buffers never grow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TemporalState {
    /// `Y`/`Z`: the child's value at the previous tick.
    Prev { value: bool },
    /// Untimed `H`, `O` and `S`.
    Latch { value: bool },
    /// `O[lo,inf]`/`H[lo,inf]` with `lo > 0`: whether a hit has been seen
    /// and the age of the first one, saturating at `lo`.
    FirstHit { seen: bool, age: u32 },
    /// `O[lo,hi]`/`H[lo,hi]`: the last `hi + 1` hits and how many of them
    /// lie at ages `lo..=hi`.
    Window { buf: Box<[bool]>, cursor: u32, count: u32 },
    /// `S[lo,inf]` with `lo > 0`: age of the earliest `q` since the last
    /// `p` gap, saturating at `lo`.
    SinceAge { valid: bool, age: u32 },
    /// `S[lo,hi]`: the last `hi + 1` values of `q`, the length of the
    /// current `p` run and the age of the most recent `q` at least `lo`
    /// ticks old (both saturating at `hi + 1`).
    SinceWindow {
        buf: Box<[bool]>,
        cursor: u32,
        run: u32,
        recent: u32,
    },
}

impl TemporalState {
    pub(crate) fn window(hi: u32) -> Self {
        TemporalState::Window {
            buf: vec![false; hi as usize + 1].into_boxed_slice(),
            cursor: 0,
            count: 0,
        }
    }

    pub(crate) fn since_window(hi: u32) -> Self {
        TemporalState::SinceWindow {
            buf: vec![false; hi as usize + 1].into_boxed_slice(),
            cursor: 0,
            run: 0,
            recent: hi + 1,
        }
    }

    /// Ring buffer capacity, if this operator has one.
    pub fn buffer_len(&self) -> Option<usize> {
        match self {
            TemporalState::Window { buf, .. } | TemporalState::SinceWindow { buf, .. } => Some(buf.len()),
            _ => None,
        }
    }

    fn encode(&self, out: &mut Vec<u8>) {
        match self {
            TemporalState::Prev { value } | TemporalState::Latch { value } => out.push(*value as u8),
            TemporalState::FirstHit { seen, age } => {
                out.push(*seen as u8);
                out.extend_from_slice(&age.to_le_bytes());
            }
            TemporalState::Window { buf, cursor, count } => {
                out.extend(buf.iter().map(|b| *b as u8));
                out.extend_from_slice(&cursor.to_le_bytes());
                out.extend_from_slice(&count.to_le_bytes());
            }
            TemporalState::SinceAge { valid, age } => {
                out.push(*valid as u8);
                out.extend_from_slice(&age.to_le_bytes());
            }
            TemporalState::SinceWindow {
                buf,
                cursor,
                run,
                recent,
            } => {
                out.extend(buf.iter().map(|b| *b as u8));
                out.extend_from_slice(&cursor.to_le_bytes());
                out.extend_from_slice(&run.to_le_bytes());
                out.extend_from_slice(&recent.to_le_bytes());
            }
        }
    }
}

/// Advance a window of hits by one tick and return how many hits lie in
/// ages `lo..=hi` afterwards.
pub(crate) fn push_window(buf: &mut [bool], cursor: &mut u32, count: &mut u32, lo: u32, hit: bool) -> u32 {
    let n = buf.len();
    let cur = *cursor as usize;
    let leaving = buf[cur];
    let entering = if lo == 0 { hit } else { buf[(cur + n - lo as usize) % n] };
    *count = *count - leaving as u32 + entering as u32;
    buf[cur] = hit;
    *cursor = ((cur + 1) % n) as u32;
    *count
}

/// Every temporal operator's state plus the tick counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonitorState {
    pub(crate) tick: u64,
    pub(crate) nodes: Vec<TemporalState>,
}

impl MonitorState {
    /// Ticks consumed so far.
    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn nodes(&self) -> &[TemporalState] {
        &self.nodes
    }

    /// Flat little-endian serialization; its length depends only on the
    /// formula.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&self.tick.to_le_bytes());
        for n in &self.nodes {
            n.encode(&mut out);
        }
        out
    }

    pub fn size_bytes(&self) -> usize {
        self.encode().len()
    }

    pub(crate) fn restore(&mut self, from: &MonitorState) {
        self.tick = from.tick;
        self.nodes.clone_from(&from.nodes);
    }
}
