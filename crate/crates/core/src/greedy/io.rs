//! Versioned JSON trace files and checkpoint CSV export.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::trace::{Checkpoint, GreedyTrace};
use crate::error::{Error, Result};
use crate::exactnum::{PrecisionInterval, PrecisionPolicy, Rational, TargetExpr};
use crate::moments::SequenceSpec;

pub const TRACE_FORMAT: &str = "signwalk-trace";
pub const TRACE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckpointRecord {
    n: u64,
    lo: String,
    hi: String,
    bits: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TraceFile {
    format: String,
    version: u32,
    target: TargetExpr,
    spec: SequenceSpec,
    steps: u64,
    stride: u64,
    precision: PrecisionPolicy,
    final_bits: u32,
    exact_mode: bool,
    /// `ε_1…ε_N` packed most-significant bit first, `1` for `+`.
    signs: String,
    final_sign: bool,
    ties: Vec<u64>,
    checkpoints: Vec<CheckpointRecord>,
}

fn pack(bits: &[bool]) -> String {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            bytes[i / 8] |= 0x80 >> (i % 8);
        }
    }
    hex::encode(bytes)
}

fn unpack(text: &str, len: u64) -> Result<Vec<bool>> {
    let bytes = hex::decode(text).map_err(|e| Error::CorruptTrace(format!("sign bits: {e}")))?;
    if bytes.len() as u64 != len.div_ceil(8) {
        return Err(Error::CorruptTrace("sign bit count does not match steps".into()));
    }
    Ok((0..len as usize)
        .map(|i| bytes[i / 8] & (0x80 >> (i % 8)) != 0)
        .collect())
}

fn parse_rational(text: &str) -> Result<Rational> {
    text.parse::<Rational>()
        .map_err(|_| Error::CorruptTrace(format!("bad rational {text:?}")))
}

impl GreedyTrace {
    pub fn to_json(&self) -> String {
        let file = TraceFile {
            format: TRACE_FORMAT.into(),
            version: TRACE_VERSION,
            target: self.target.clone(),
            spec: self.spec.clone(),
            steps: self.len(),
            stride: self.stride,
            precision: self.policy,
            final_bits: self.final_bits,
            exact_mode: self.exact_mode,
            signs: pack(&self.signs),
            final_sign: self.final_sign,
            ties: self.ties.clone(),
            checkpoints: self
                .checkpoints
                .iter()
                .map(|c| CheckpointRecord {
                    n: c.n,
                    lo: c.error.lo().to_string(),
                    hi: c.error.hi().to_string(),
                    bits: c.error.bits(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("trace serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TraceFile =
            serde_json::from_str(text).map_err(|e| Error::CorruptTrace(e.to_string()))?;
        if file.format != TRACE_FORMAT || file.version != TRACE_VERSION {
            return Err(Error::CorruptTrace(format!(
                "unsupported format {} v{}",
                file.format, file.version
            )));
        }
        let checkpoints = file
            .checkpoints
            .iter()
            .map(|c| {
                let error = PrecisionInterval::new(parse_rational(&c.lo)?, parse_rational(&c.hi)?, c.bits)
                    .map_err(|e| Error::CorruptTrace(e.to_string()))?;
                Ok(Checkpoint { n: c.n, error })
            })
            .collect::<Result<Vec<_>>>()?;
        GreedyTrace::assemble(
            file.target,
            file.spec,
            file.stride,
            file.precision,
            unpack(&file.signs, file.steps)?,
            file.final_sign,
            file.ties,
            checkpoints,
            file.final_bits,
            file.exact_mode,
        )
    }

    /// Checkpoint table as CSV: `n,sign,log10_error_lo,log10_error_hi`.
    pub fn write_checkpoint_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "n,sign,log10_error_lo,log10_error_hi")?;
        for c in &self.checkpoints {
            let (lo, hi) = c.error.log10_bounds();
            writeln!(out, "{},{},{},{}", c.n, self.sign(c.n), lo, hi)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packing_round_trips() {
        let bits: Vec<bool> = (0..37).map(|i| i % 3 == 0 || i % 5 == 1).collect();
        assert_eq!(unpack(&pack(&bits), 37).unwrap(), bits);
        assert_eq!(pack(&[true, false, false, false, false, false, false, true, true]), "8180");
        assert!(unpack("80", 9).is_err());
        assert!(unpack("zz", 1).is_err());
    }
}
