use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{PrecisionInterval, PrecisionPolicy, TargetExpr};
use crate::moments::SequenceSpec;

/// Position of a partial sum relative to the target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Below,
    Equal,
    Above,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub n: u64,
    /// Enclosure of `|x − a_n|`.
    pub error: PrecisionInterval,
}

/// Record of one greedy run. Signs determine every partial sum; crossings
/// are derived from signs and exact ties.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyTrace {
    pub(crate) target: TargetExpr,
    pub(crate) spec: SequenceSpec,
    pub(crate) stride: u64,
    pub(crate) policy: PrecisionPolicy,
    /// `ε_1, …, ε_N`, `true` for `+`.
    pub(crate) signs: Vec<bool>,
    /// Whether `a_N ≤ x`, i.e. the sign the next step would take.
    pub(crate) final_sign: bool,
    /// Indices `m ∈ [0, N]` with `a_m = x` exactly.
    pub(crate) ties: Vec<u64>,
    pub(crate) checkpoints: Vec<Checkpoint>,
    pub(crate) final_bits: u32,
    pub(crate) exact_mode: bool,
    pub(crate) crossings: Vec<u64>,
}

impl GreedyTrace {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        target: TargetExpr,
        spec: SequenceSpec,
        stride: u64,
        policy: PrecisionPolicy,
        signs: Vec<bool>,
        final_sign: bool,
        ties: Vec<u64>,
        checkpoints: Vec<Checkpoint>,
        final_bits: u32,
        exact_mode: bool,
    ) -> Result<Self> {
        let n = signs.len() as u64;
        if n == 0 {
            return Err(Error::CorruptTrace("trace has no steps".into()));
        }
        if stride == 0 {
            return Err(Error::CorruptTrace("checkpoint stride is zero".into()));
        }
        if ties.windows(2).any(|w| w[0] >= w[1]) || ties.last().is_some_and(|&t| t > n) {
            return Err(Error::CorruptTrace("tie indices out of order or range".into()));
        }
        if checkpoints.windows(2).any(|w| w[0].n >= w[1].n)
            || checkpoints.iter().any(|c| c.n == 0 || c.n > n)
        {
            return Err(Error::CorruptTrace("checkpoint indices out of order or range".into()));
        }
        let mut trace = GreedyTrace {
            target,
            spec,
            stride,
            policy,
            signs,
            final_sign,
            ties,
            checkpoints,
            final_bits,
            exact_mode,
            crossings: Vec::new(),
        };
        for &t in &trace.ties {
            if !trace.next_sign(t) {
                return Err(Error::CorruptTrace(format!("tie at {t} followed by a minus sign")));
            }
        }
        trace.crossings = (0..n)
            .filter(|&m| {
                let (s, t) = (trace.side(m), trace.side(m + 1));
                s == Side::Equal || t == Side::Equal || s != t
            })
            .collect();
        Ok(trace)
    }

    /// The sign chosen after `a_m`: `ε_{m+1}`, or the final side for `m = N`.
    fn next_sign(&self, m: u64) -> bool {
        self.signs.get(m as usize).copied().unwrap_or(self.final_sign)
    }

    pub fn target(&self) -> &TargetExpr {
        &self.target
    }

    pub fn spec(&self) -> &SequenceSpec {
        &self.spec
    }

    /// Number of steps `N`.
    pub fn len(&self) -> u64 {
        self.signs.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn stride(&self) -> u64 {
        self.stride
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.policy
    }

    pub fn signs(&self) -> &[bool] {
        &self.signs
    }

    /// `ε_n ∈ {+1, −1}` for `1 ≤ n ≤ N`.
    pub fn sign(&self, n: u64) -> i8 {
        assert!(n >= 1 && n <= self.len(), "sign index {n} out of range");
        if self.signs[n as usize - 1] {
            1
        } else {
            -1
        }
    }

    pub fn final_sign(&self) -> bool {
        self.final_sign
    }

    /// Where `a_m` lies relative to the target, `0 ≤ m ≤ N`.
    pub fn side(&self, m: u64) -> Side {
        if self.ties.binary_search(&m).is_ok() {
            Side::Equal
        } else if self.next_sign(m) {
            Side::Below
        } else {
            Side::Above
        }
    }

    pub fn ties(&self) -> &[u64] {
        &self.ties
    }

    pub fn is_tie(&self, m: u64) -> bool {
        self.ties.binary_search(&m).is_ok()
    }

    pub fn checkpoints(&self) -> &[Checkpoint] {
        &self.checkpoints
    }

    /// Indices `m < N` with `min(a_m, a_{m+1}) ≤ x ≤ max(a_m, a_{m+1})`.
    pub fn crossings(&self) -> &[u64] {
        &self.crossings
    }

    pub fn first_crossing(&self) -> Option<u64> {
        self.crossings.first().copied()
    }

    pub fn final_bits(&self) -> u32 {
        self.final_bits
    }

    pub fn exact_mode(&self) -> bool {
        self.exact_mode
    }
}

/// Smallest `m` with `a_m` and `a_{m+1}` bracketing the target.
pub fn first_crossing(trace: &GreedyTrace) -> Option<u64> {
    trace.first_crossing()
}
