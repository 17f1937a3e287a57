//! Eavesdropping analysis: mutual information, the cloning channel, proper
//! colorings, the SeeSaw attack optimization, key rates and randomness.

pub mod attack;
pub mod channel;
pub mod coloring;
pub mod information;
pub mod randomness;
pub mod seesaw;

pub use attack::{
    evaluate_attack, evaluate_attack_with, reference_attack_strategy,
    reference_attack_strategy_best, AttackModel, KeyRateReport, OffDiagonalSign,
    KEY_ROUND_FRACTION, REFERENCE_ATTACK_Q,
};
pub use channel::{eve_channel, eve_channel_unitary};
pub use coloring::{enumerate_colorings, Coloring, REFERENCE_COLORING};
pub use information::{binary_entropy, mutual_information, JointDistribution};
pub use randomness::{randomness_bounds, RandomnessConfig, RandomnessReport};
pub use seesaw::{
    key_rate_csv, key_rate_vs_s, seesaw_max_s, unit_grid, KeyRatePoint, SeesawConfig, SeesawOutcome,
};
