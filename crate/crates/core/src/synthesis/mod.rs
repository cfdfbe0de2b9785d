// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Two-qubit block analysis, KAK re-synthesis and single-qubit gate merging.

mod blocks;
mod kak;
mod merge;
mod unitary;

pub use blocks::{block_unitary, collect_blocks, predict_c2q, resynthesize_blocks, TwoQubitBlock};
pub use kak::{canonical_gate, kak_decompose, weyl_coordinates, KakDecomposition};
pub use merge::merge_1q_runs;
pub use unitary::{cx_cost, cx_count, kak_synthesize, min_cnot_count, pair_unitary, synthesize_gates};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SynthesisError {
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("re-synthesized circuit deviates from the target by {0:e}")]
    SynthesisResidual(f64),
}
