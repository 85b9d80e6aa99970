//! Generators, exhaustive enumeration, adversaries, soundness fuzzing and
//! certificate-size measurement.

pub mod adversary;
pub mod enumerate;
pub mod fuzz;
pub mod generators;
pub mod measure;

pub use adversary::{adversarial_certificates, honest_best_effort, AdversaryKind, AdversaryStrategy};
pub use enumerate::{enumerate_connected_graphs, TooLarge};
pub use fuzz::{fuzz_soundness, Counterexample, FuzzError, FuzzReport};
pub use generators::{generate, Family, GenerateError, GeneratedGraph, GeneratorSpec};
pub use measure::{measure_scaling, MeasureError, ScalingReport, ScalingRow};
