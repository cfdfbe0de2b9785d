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

//! Optimization-aware qubit routing.
//!
//! The crate is organised bottom-up:
//!
//! * [`circuit`] holds the gate set, OpenQASM 2.0 reader/writer, the dependency DAG, circuit
//!   metrics and a small statevector simulator used as a semantics oracle.
//! * [`topology`] describes device connectivity and the (optionally noise-weighted) distance
//!   matrices the routers score against.
//! * [`synthesis`] collects two-qubit blocks and re-synthesizes them with a KAK decomposition.
//! * [`commutation`] groups commuting gates into per-wire sets and cancels self-inverse pairs.
//! * [`routing`] contains the SABRE baseline and the optimization-aware NASSC router together with
//!   the full transpilation pipeline.
//! * [`bench`] is the benchmark harness that produces the comparison tables as CSV.

pub mod bench;
pub mod circuit;
pub mod commutation;
mod error;
pub mod linalg;
pub mod routing;
pub mod synthesis;
pub mod topology;

pub use error::Error;
