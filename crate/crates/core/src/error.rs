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

use thiserror::Error;

use crate::circuit::qasm::QasmError;
use crate::circuit::{CircuitError, SimError};
use crate::routing::RoutingError;
use crate::synthesis::SynthesisError;
use crate::topology::TopologyError;

/// Umbrella error for callers that drive several stages at once (pipeline, CLI, bench).
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Qasm(#[from] QasmError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Routing(#[from] RoutingError),
    #[error("circuit still contains an undecomposed SWAP gate")]
    UndecomposedSwap,
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed {what}: {reason}")]
    Format { what: String, reason: String },
}
