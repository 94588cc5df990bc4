use serde::{Deserialize, Serialize};

use super::decompose::lower_op;
use super::CircuitFragment;
use crate::qsim::{GateKind, GateOp};

/// Physical pulse counts for a fragment.
///
/// `u1`-form gates are frame changes, `u2`-form gates (H) are one GD pulse,
/// CX is counted directly and SWAP as three CX. X gates are tallied
/// separately; whether they cost a GD pulse is a timing-model decision.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PulseCensus {
    pub fc_count: u64,
    pub gd_count: u64,
    pub cx_count: u64,
    pub swap_count: u64,
    pub x_count: u64,
}

impl PulseCensus {
    fn add_op(&mut self, op: &GateOp) {
        match op.kind {
            GateKind::U1(_) => self.fc_count += 1,
            GateKind::H => self.gd_count += 1,
            GateKind::X => self.x_count += 1,
            GateKind::Cx => self.cx_count += 1,
            GateKind::Swap => {
                self.swap_count += 1;
                self.cx_count += 3;
            }
            GateKind::Cz | GateKind::Mcz => {
                for native in lower_op(op) {
                    self.add_op(&native);
                }
            }
        }
    }
}

impl std::ops::Add for PulseCensus {
    type Output = Self;

    fn add(self, o: Self) -> Self {
        Self {
            fc_count: self.fc_count + o.fc_count,
            gd_count: self.gd_count + o.gd_count,
            cx_count: self.cx_count + o.cx_count,
            swap_count: self.swap_count + o.swap_count,
            x_count: self.x_count + o.x_count,
        }
    }
}

pub fn pulse_census(frag: &CircuitFragment) -> PulseCensus {
    let mut census = PulseCensus::default();
    for op in &frag.ops {
        census.add_op(op);
    }
    census
}
