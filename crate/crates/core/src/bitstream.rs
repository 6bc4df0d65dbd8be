//! Commutation bit streams a(1), a(2), ...
//!
//! All kinds are random access: `bit(t)` never depends on which other indices
//! were queried before, so sweeps may evaluate lags in any order and from any
//! thread.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum StreamKind {
    Constant(bool),
    Periodic(Vec<bool>),
    ThueMorse,
    Bernoulli { p: f64, seed: u64 },
    Explicit(Arc<[bool]>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BitStream {
    kind: StreamKind,
    threshold: u64,
}

/// splitmix64 finalizer; a bijective mixer on u64.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl BitStream {
    pub fn new(kind: StreamKind) -> Result<Self> {
        let threshold = match &kind {
            StreamKind::Bernoulli { p, .. } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::invalid(format!("bernoulli probability {p} outside [0, 1]")));
                }
                if *p >= 1.0 {
                    u64::MAX
                } else {
                    (p * 18_446_744_073_709_551_616.0) as u64
                }
            }
            StreamKind::Periodic(pattern) if pattern.is_empty() => {
                return Err(Error::invalid("periodic pattern must be nonempty"));
            }
            _ => 0,
        };
        Ok(BitStream { kind, threshold })
    }

    pub fn constant(bit: bool) -> Self {
        Self::new(StreamKind::Constant(bit)).unwrap()
    }

    pub fn thue_morse() -> Self {
        Self::new(StreamKind::ThueMorse).unwrap()
    }

    pub fn periodic(pattern: &[bool]) -> Result<Self> {
        Self::new(StreamKind::Periodic(pattern.to_vec()))
    }

    pub fn bernoulli(p: f64, seed: u64) -> Result<Self> {
        Self::new(StreamKind::Bernoulli { p, seed })
    }

    /// `bits[k - 1]` is a(k).
    pub fn explicit(bits: Vec<bool>) -> Self {
        Self::new(StreamKind::Explicit(bits.into())).unwrap()
    }

    pub fn kind(&self) -> &StreamKind {
        &self.kind
    }

    /// a(t) for t >= 1.
    pub fn bit(&self, t: i64) -> Result<u8> {
        if t < 1 {
            return Err(Error::StreamIndex(t));
        }
        if let StreamKind::Explicit(bits) = &self.kind {
            if t as usize > bits.len() {
                return Err(Error::invalid(format!(
                    "explicit stream defines {} bits, a({t}) requested",
                    bits.len()
                )));
            }
        }
        Ok(self.lag_bit(t as u64) as u8)
    }

    /// Unchecked hot-path variant of [`bit`](Self::bit). `lag` must be >= 1;
    /// explicit streams read past their end as 0.
    #[inline]
    pub fn lag_bit(&self, lag: u64) -> bool {
        debug_assert!(lag >= 1);
        match &self.kind {
            StreamKind::Constant(b) => *b,
            StreamKind::Periodic(p) => p[((lag - 1) % p.len() as u64) as usize],
            StreamKind::ThueMorse => lag.count_ones() % 2 == 1,
            StreamKind::Bernoulli { seed, .. } => {
                mix64(seed.wrapping_add(mix64(lag).wrapping_mul(0x9e37_79b9_7f4a_7c15))) < self.threshold
            }
            StreamKind::Explicit(bits) => bits.get((lag - 1) as usize).copied().unwrap_or(false),
        }
    }

    /// (-1)^{a(lag)}
    #[inline]
    pub fn sign(&self, lag: u64) -> i8 {
        if self.lag_bit(lag) {
            -1
        } else {
            1
        }
    }

    /// (1/T) sum_{t=1}^{T} a(t).
    pub fn empirical_mean(&self, horizon: u64) -> Result<f64> {
        if horizon == 0 {
            return Err(Error::invalid("horizon must be >= 1"));
        }
        let mut ones = 0u64;
        for t in 1..=horizon {
            ones += self.bit(t as i64)? as u64;
        }
        Ok(ones as f64 / horizon as f64)
    }

    /// Reads one ASCII bit per line; line k is a(k).
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut bits = Vec::new();
        let mut offset = 0;
        for line in text.lines() {
            match line.trim() {
                "0" => bits.push(false),
                "1" => bits.push(true),
                "" => {}
                other => return Err(Error::parse(offset, other, "expected a single 0 or 1 per line")),
            }
            offset += line.len() + 1;
        }
        Ok(Self::explicit(bits))
    }
}

impl FromStr for BitStream {
    type Err = Error;

    /// `constant:0`, `periodic:0110`, `thue-morse`, `bernoulli:0.5:seed=42`,
    /// `file:<path>`.
    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, rest) = match spec.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (spec, None),
        };
        let arg_pos = head.len() + 1;
        let bits_of = |s: &str| -> Result<Vec<bool>> {
            s.chars()
                .enumerate()
                .map(|(i, c)| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Error::parse(arg_pos + i, c.to_string(), "expected 0 or 1")),
                })
                .collect()
        };
        match (head, rest) {
            ("constant", Some(b)) => {
                let bits = bits_of(b)?;
                if bits.len() != 1 {
                    return Err(Error::parse(arg_pos, b, "constant takes a single bit"));
                }
                Ok(Self::constant(bits[0]))
            }
            ("periodic", Some(p)) => {
                if p.is_empty() {
                    return Err(Error::parse(arg_pos, p, "empty periodic pattern"));
                }
                Self::periodic(&bits_of(p)?)
            }
            ("thue-morse", None) => Ok(Self::thue_morse()),
            ("bernoulli", Some(args)) => {
                let (p_text, seed_text) = args.split_once(':').unwrap_or((args, "seed=0"));
                let p: f64 = p_text
                    .parse()
                    .map_err(|_| Error::parse(arg_pos, p_text, "invalid probability"))?;
                let seed_pos = arg_pos + p_text.len() + 1;
                let seed_val = seed_text
                    .strip_prefix("seed=")
                    .ok_or_else(|| Error::parse(seed_pos, seed_text, "expected seed=<u64>"))?;
                let seed: u64 = seed_val
                    .parse()
                    .map_err(|_| Error::parse(seed_pos + 5, seed_val, "invalid seed"))?;
                Self::bernoulli(p, seed).map_err(|_| Error::parse(arg_pos, p_text, "probability outside [0, 1]"))
            }
            ("file", Some(path)) => Self::from_file(Path::new(path)),
            _ => Err(Error::parse(0, spec, "unknown stream spec")),
        }
    }
}

impl fmt::Display for BitStream {
    /// Explicit streams print their bits inline as `explicit:<bits>`, which
    /// does not parse back; they usually come from `file:` specs.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits = |b: &[bool]| b.iter().map(|&x| if x { '1' } else { '0' }).collect::<String>();
        let text = match &self.kind {
            StreamKind::Constant(b) => format!("constant:{}", *b as u8),
            StreamKind::Periodic(p) => format!("periodic:{}", bits(p)),
            StreamKind::ThueMorse => "thue-morse".to_string(),
            StreamKind::Bernoulli { p, seed } => format!("bernoulli:{p}:seed={seed}"),
            StreamKind::Explicit(b) => format!("explicit:{}", bits(b)),
        };
        f.pad(&text)
    }
}
