//! Embedding `K_m □ K_n` problem graphs into Chimera chips.
//!
//! The systematic embedder ([`cpcg_embed`]) repeats a clique nexus along the chip
//! diagonal and joins copies through straight buses; its fault-tolerant variant
//! ([`ft_cpcg_embed`]) reroutes around dead qubits and couplers. A triangular
//! clique embedder and a randomized heuristic serve as baselines.
//!
//! Model coefficients are generic over [`Scalar`]; graphs and embeddings are integral.

pub mod analysis;
pub mod bench;
pub mod chimera;
pub mod cpcg;
pub mod embedding;
pub mod error;
pub mod fault_tolerant;
pub mod heuristic;
pub mod io;
pub mod lower;
pub mod problem;
pub mod qubo;
pub mod render;
pub mod scalar;
pub mod triangular;
pub mod validate;

use num_rational::Rational64;

pub use analysis::{
    chimera_treewidth, max_embeddable_n, optimality_certificate, product_tw_lower_bound, refusal,
    triangular_max_n, OptimalityCertificate, Refusal, Verdict,
};
pub use bench::{bench_sweep, BenchConfig, BenchRow, Method};
pub use chimera::{CapacityMap, ChimeraSpec, Fault, HardwareGraph, QubitCoord, QubitId, Shore};
pub use cpcg::{bus_plan, cpcg_embed, cpcg_embed_best, cpcg_embed_on, required_size, BusPlan};
pub use embedding::{chain_stats, ChainStats, Embedding};
pub use error::{Error, Result};
pub use fault_tolerant::{ft_cpcg_embed, FtConfig, FtEmbedding, FtFailure};
pub use heuristic::{heuristic_embed, success_rate, HeuristicOutcome, HeuristicParams};
pub use lower::{decode, lower_model, PhysicalModel};
pub use problem::{complete_graph, complete_product, detect_cpcg, ProblemGraph};
pub use qubo::{ising_from_qubo, partitioning_qubo, IsingModel, QuboMatrix};
pub use scalar::Scalar;
pub use triangular::{nexus_template, triangular_embed, NexusTemplate};
pub use validate::{validate, ValidationReport, Violation, ViolationKind};

pub type Qubo = QuboMatrix<f64>;
pub type Ising = IsingModel<f64>;
pub type Qubo32 = QuboMatrix<f32>;
pub type Ising32 = IsingModel<f32>;
/// Exact rational coefficients; energies compare without rounding.
pub type ExactQubo = QuboMatrix<Rational64>;
pub type ExactIsing = IsingModel<Rational64>;
