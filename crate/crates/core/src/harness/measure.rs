use thiserror::Error;

use super::generators::{generate, Family, GenerateError, GeneratorSpec};
use crate::framework::{max_cert_bits, size_ratio, ProverError};
use crate::p5::prove;

/// Edge (or join) probability used for scaling runs.
pub const DEFAULT_P: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("family {family} produced a graph with an induced P5 at n={n}, seed={seed}")]
    NotP5Free { family: Family, n: usize, seed: u64 },
    #[error("prover failed at n={n}: {source}")]
    Prover { n: usize, source: ProverError },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub family: Family,
    pub seed: u64,
    pub max_cert_bits: usize,
    /// `max_cert_bits / n^{3/2}`.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
}

impl ScalingReport {
    /// Fitted constant: the largest ratio over all rows.
    pub fn constant(&self) -> f64 {
        self.rows.iter().map(|r| r.ratio).fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,family,seed,max_cert_bits,ratio\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{},{:.6}\n", r.n, r.family, r.seed, r.max_cert_bits, r.ratio));
        }
        out
    }
}

/// Generates one graph per size with `seed`, proves it and records the
/// longest certificate.
pub fn measure_scaling(sizes: &[usize], family: Family, seed: u64) -> Result<ScalingReport, MeasureError> {
    let rows = sizes
        .iter()
        .map(|&n| {
            let out = generate(&GeneratorSpec {
                family,
                n,
                p: DEFAULT_P,
                seed,
            })?;
            if !out.p5free {
                return Err(MeasureError::NotP5Free { family, n, seed });
            }
            let certs = prove(&out.graph).map_err(|source| MeasureError::Prover { n, source })?;
            let bits = max_cert_bits(&certs);
            Ok(ScalingRow {
                n,
                family,
                seed,
                max_cert_bits: bits,
                ratio: size_ratio(bits, n),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok(ScalingReport { rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex_gives_the_minimal_certificate() {
        let r = measure_scaling(&[1], Family::Split, 0).unwrap();
        assert_eq!(r.rows[0].max_cert_bits, 11);
        assert_eq!(r.to_csv(), "n,family,seed,max_cert_bits,ratio\n1,split,0,11,11.000000\n");
    }

    #[test]
    fn reruns_are_identical() {
        let a = measure_scaling(&[8, 20], Family::Cograph, 4).unwrap();
        let b = measure_scaling(&[8, 20], Family::Cograph, 4).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.constant() >= a.rows[1].ratio);
    }

    #[test]
    fn families_with_p5_are_refused() {
        assert!(matches!(
            measure_scaling(&[12], Family::WithP5, 1),
            Err(MeasureError::NotP5Free { .. })
        ));
    }
}
